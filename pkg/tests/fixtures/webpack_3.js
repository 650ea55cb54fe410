(self.__LOADABLE_LOADED_CHUNKS__=self.__LOADABLE_LOADED_CHUNKS__||[]).push([[76429],{122954:function(e,t,n){for(var i=0;i<4;i++){n.m[i]=i*i;}t.table=n.m;},663301:function(e,t,n){while(n.pending.length){n.pending.pop()();}}}]);
